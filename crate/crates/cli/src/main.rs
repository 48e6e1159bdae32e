use clap::Parser;

fn main() {
    let cli = imc_cli::Cli::parse();
    match imc_cli::run(&cli) {
        Ok(output) => print!("{output}"),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(err.exit_code());
        }
    }
}
