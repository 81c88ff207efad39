use std::process::ExitCode;

use noframe_cli::{parse_args, run_command, write_report, ArgError};

fn main() -> ExitCode {
    let cfg = match parse_args(std::env::args_os()) {
        Ok(cfg) => cfg,
        Err(ArgError::Clap(e)) => e.exit(),
        Err(e @ ArgError::Invalid(_)) => {
            eprintln!("{e}\n\nFor more information, try '--help'.");
            return ExitCode::from(2);
        }
    };
    let report = match run_command(&cfg) {
        Ok(r) => r,
        Err(e) => {
            let diag = serde_json::json!({ "command": cfg.command.name(), "error": e.to_string() });
            eprintln!("{diag}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = write_report(&report, &cfg) {
        eprintln!("{}", serde_json::json!({ "command": cfg.command.name(), "error": e.to_string() }));
        return ExitCode::from(1);
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
