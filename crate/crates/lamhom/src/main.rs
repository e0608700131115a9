fn main() {
    std::process::exit(lamhom::cli::run(std::env::args_os()));
}
