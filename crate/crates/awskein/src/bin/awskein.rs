fn main() {
    std::process::exit(awskein::cli::run(std::env::args_os()));
}
