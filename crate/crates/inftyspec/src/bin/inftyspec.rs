fn main() {
    std::process::exit(inftyspec::cli::run());
}
