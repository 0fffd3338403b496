use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let env_prec = std::env::var("PADIC_PREC").ok();
    let (code, out) = padic_potts_cli::main_with(std::env::args_os(), env_prec.as_deref());
    let mut stdout = std::io::stdout().lock();
    if stdout
        .write_all(out.as_bytes())
        .and_then(|_| stdout.flush())
        .is_err()
    {
        return ExitCode::FAILURE;
    }
    ExitCode::from(code as u8)
}
