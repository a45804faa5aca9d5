fn main() {
    std::process::exit(kfactor_cli::run(std::env::args_os()));
}
