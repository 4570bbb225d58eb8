fn main() {
    std::process::exit(banddepth_cli::main_with_args(std::env::args_os()));
}
