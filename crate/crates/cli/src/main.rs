fn main() {
    std::process::exit(kitaev_cli::run_from_args(std::env::args_os()));
}
