fn main() {
    std::process::exit(pathwright::cli::cli_main(std::env::args_os()));
}
