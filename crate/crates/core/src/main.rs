fn main() {
    std::process::exit(analog_grover::cli::run(std::env::args_os()));
}
