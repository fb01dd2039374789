fn main() {
    std::process::exit(twistzeta::cli::main_with_args(std::env::args_os()));
}
