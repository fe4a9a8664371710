fn main() {
    std::process::exit(bellscope_cli::run(std::env::args_os()));
}
