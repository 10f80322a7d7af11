fn main() {
    std::process::exit(bnb_assess_cli::run(std::env::args_os()));
}
