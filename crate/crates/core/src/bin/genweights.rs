fn main() {
    std::process::exit(genweights::cli::main_entry());
}
