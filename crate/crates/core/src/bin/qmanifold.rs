use qmanifold::cli;
use std::io::Write;

fn main() {
    let env = std::env::var(qmanifold::tolerances::TOL_ENV).ok();
    let out = cli::run(std::env::args_os(), env.as_deref());
    std::io::stdout().write_all(out.stdout.as_bytes()).ok();
    std::io::stderr().write_all(out.stderr.as_bytes()).ok();
    std::process::exit(out.code);
}
