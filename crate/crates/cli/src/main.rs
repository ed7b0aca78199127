fn main() {
    std::process::exit(hiveflow_cli::run(std::env::args_os()));
}
