use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    // OVAL_THREADS caps the worker pool; 0 or unset means one per core.
    if let Some(n) = std::env::var("OVAL_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let code = oval_cli::dispatch(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code as u8)
}
