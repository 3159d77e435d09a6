fn main() -> std::process::ExitCode {
    sota_bias::cli::main()
}
