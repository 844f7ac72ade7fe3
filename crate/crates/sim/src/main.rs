fn main() {
    std::process::exit(ramsp_sim::cli::cli_main());
}
