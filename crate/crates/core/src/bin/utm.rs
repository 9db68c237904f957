fn main() {
    std::process::exit(utm_core::cli::main_with_args(std::env::args_os()));
}
