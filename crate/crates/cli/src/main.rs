use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let cap = std::env::var(shiftlab_cli::MAX_DENOM_BITS_VAR).ok();
    let out = shiftlab_cli::run(std::env::args_os(), cap.as_deref());
    // Ignore write errors such as a closed pipe.
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code)
}
