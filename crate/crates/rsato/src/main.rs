fn main() {
    std::process::exit(rsato::cli_main());
}
