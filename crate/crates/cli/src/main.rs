use std::io::Write;

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let outcome = neighborly_cli::run(&argv);
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(outcome.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        std::process::exit(neighborly_cli::EXIT_INTERNAL);
    }
    std::process::exit(outcome.exit_code);
}
