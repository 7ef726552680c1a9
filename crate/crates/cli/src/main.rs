fn main() {
    std::process::exit(dynsamp_cli::run(std::env::args_os()));
}
