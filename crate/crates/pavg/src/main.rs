fn main() -> std::process::ExitCode {
    pavg::cli::main()
}
