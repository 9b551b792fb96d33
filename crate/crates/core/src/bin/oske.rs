fn main() {
    std::process::exit(oske::cli::main());
}
