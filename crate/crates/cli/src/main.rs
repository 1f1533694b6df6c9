use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use twdp_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let res = run(&cli, &mut out).and_then(|()| out.flush().map_err(Into::into));
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("twdp: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
