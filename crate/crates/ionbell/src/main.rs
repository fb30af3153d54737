use std::process::ExitCode;

fn main() -> ExitCode {
    ionbell::cli::run()
}
