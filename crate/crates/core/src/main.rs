fn main() {
    std::process::exit(photon_cluster::cli::main_with_args(std::env::args_os()));
}
