fn main() {
    std::process::exit(codesieve::cli::run(std::env::args()));
}
