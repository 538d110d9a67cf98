fn main() {
    std::process::exit(skewcoh::cli::main_entry());
}
