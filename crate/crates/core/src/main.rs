fn main() {
    std::process::exit(hqc_core::cli::main_entry());
}
