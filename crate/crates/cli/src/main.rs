fn main() {
    std::process::exit(mtcodes_cli::run(std::env::args_os()));
}
