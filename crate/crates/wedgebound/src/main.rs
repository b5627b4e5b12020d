fn main() {
    std::process::exit(wedgebound::cli::main());
}
