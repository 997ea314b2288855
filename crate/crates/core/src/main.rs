fn main() {
    std::process::exit(fockphase::cli::main_with(std::env::args_os()));
}
