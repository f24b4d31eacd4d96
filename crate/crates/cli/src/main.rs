fn main() {
    std::process::exit(undet_cli::run(std::env::args_os()));
}
