// SPDX-License-Identifier: Apache-2.0
use clap::Parser;

fn main() {
    let cli = cama::cli::Cli::parse();
    let stdout = std::io::stdout();
    let code = match cama::cli::run(cli, &mut stdout.lock()) {
        Ok(()) => cama::error::exit::OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
