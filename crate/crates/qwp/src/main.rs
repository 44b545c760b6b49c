fn main() {
    std::process::exit(qwp::cli::run());
}
