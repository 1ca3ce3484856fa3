fn main() {
    std::process::exit(zigzag_edge::cli::run());
}
