fn main() {
    std::process::exit(reanneal_core::harness::cli::cli_main(std::env::args_os()));
}
