fn main() {
    std::process::exit(twinreg_cli::run(std::env::args_os()));
}
