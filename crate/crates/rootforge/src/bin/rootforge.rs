fn main() { std::process::exit(rootforge::cli::run()); }
