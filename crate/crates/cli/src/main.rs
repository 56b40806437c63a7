fn main() {
    std::process::exit(ctl_cli::run(std::env::args_os()));
}
