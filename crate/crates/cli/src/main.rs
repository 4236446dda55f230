fn main() {
    std::process::exit(qsdc_cli::main_with_args(std::env::args_os()));
}
