fn main() {
    std::process::exit(discocat::cli::run_main(std::env::args_os()));
}
