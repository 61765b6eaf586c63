fn main() {
    std::process::exit(acg_closure::cli::main_with_args(std::env::args_os()));
}
