use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let report = axbc_core::cli::run(std::env::args_os());
    print!("{}", report.render());
    let _ = std::io::stdout().flush();
    if let Some(msg) = &report.diagnostic {
        eprint!("{msg}");
        if !msg.ends_with('\n') {
            eprintln!();
        }
    }
    ExitCode::from(report.exit_code as u8)
}
