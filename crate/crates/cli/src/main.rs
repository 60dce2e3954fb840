use clap::Parser;
use cm_torus_cli::cli::{execute, Args};

fn main() {
    let args = Args::parse();
    let code = match execute(&args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("cmtorus: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
