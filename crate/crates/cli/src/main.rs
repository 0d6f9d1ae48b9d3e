fn main() {
    std::process::exit(chebdyn_cli::run(std::env::args_os()));
}
