use std::io::Write;
use std::process::ExitCode;
use std::thread;

// Term walks are recursive, so deep answers need a large stack.
const STACK_SIZE: usize = 256 * 1024 * 1024;

fn main() -> ExitCode {
    let report = thread::Builder::new()
        .stack_size(STACK_SIZE)
        .spawn(|| rowhorn::run(std::env::args_os()))
        .expect("failed to start worker thread")
        .join()
        .expect("worker thread panicked");
    let _ = std::io::stdout().write_all(report.stdout.as_bytes());
    let _ = std::io::stderr().write_all(report.stderr.as_bytes());
    ExitCode::from(report.exit_code as u8)
}
