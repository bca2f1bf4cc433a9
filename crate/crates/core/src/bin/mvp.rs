use clap::Parser;

fn main() {
    let cli = mvp_core::cli::Cli::parse();
    if let Err(err) = mvp_core::cli::run(cli) {
        eprintln!("error: {err}");
        std::process::exit(1);
    }
}
