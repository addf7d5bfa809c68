fn main() {
    std::process::exit(harmoney::cli::main_from_env());
}
