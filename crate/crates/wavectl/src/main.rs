fn main() {
    std::process::exit(wavectl::run(std::env::args_os()));
}
