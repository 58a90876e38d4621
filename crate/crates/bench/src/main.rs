fn main() {
    std::process::exit(copq_bench::cli::run(std::env::args_os()));
}
