use propint::cli;

fn main() {
    let result = cli::execute(std::env::args());
    if !result.stdout_payload.is_empty() {
        print!("{}", result.stdout_payload);
    }
    std::process::exit(result.exit_code);
}
