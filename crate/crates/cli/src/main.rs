use clap::Parser;

use vesseltrack_cli::commands::{execute, Cli};

fn main() {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(serde_json::Value::Null) => {}
        Ok(doc) => println!(
            "{}",
            serde_json::to_string_pretty(&doc).expect("json output")
        ),
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            std::process::exit(failure.exit_code());
        }
    }
}
