fn main() {
    std::process::exit(ck_lattice::cli::main_with_args(std::env::args_os()));
}
