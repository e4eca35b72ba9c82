fn main() {
    std::process::exit(litscout::cli::cli_main(std::env::args_os()));
}
