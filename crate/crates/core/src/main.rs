fn main() {
    std::process::exit(kappanet::cli::main());
}
