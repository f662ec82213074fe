use std::io::Write;
use std::process::ExitCode;

use smooth_world::commands::{execute, EXIT_USAGE};
use smooth_world::config::{parse_args, Parsed};

fn main() -> ExitCode {
    let config = match parse_args(std::env::args_os().skip(1)) {
        Ok(Parsed::Run(c)) => c,
        Ok(Parsed::Info(text)) => {
            print!("{text}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let (output, status) = execute(&config);
    let mut stdout = std::io::stdout().lock();
    if status == EXIT_USAGE || output.starts_with("error:") {
        eprint!("{output}");
    } else {
        let _ = stdout.write_all(output.as_bytes());
    }
    let _ = stdout.flush();
    ExitCode::from(status as u8)
}
