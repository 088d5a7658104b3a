fn main() {
    std::process::exit(spinsq::pipeline::run(std::env::args_os()));
}
