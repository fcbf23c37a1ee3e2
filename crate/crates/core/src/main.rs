use clap::Parser;

fn main() {
    let cli = framescale::cli::Cli::parse();
    match framescale::cli::run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}
