fn main() {
    std::process::exit(qaffine::cli::run());
}
