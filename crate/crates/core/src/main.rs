fn main() {
    std::process::exit(ldpc_ids::cli::cli_main(std::env::args_os()));
}
