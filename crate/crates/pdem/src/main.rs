fn main() {
    std::process::exit(pdem::cli::run());
}
