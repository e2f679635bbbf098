fn main() {
    std::process::exit(multiscreen::cli::main());
}
