use clap::Parser;

fn main() {
    let cli = beepnet_cli::Cli::parse();
    std::process::exit(beepnet_cli::dispatch(cli));
}
