fn main() {
    std::process::exit(freelip::harness::run(std::env::args_os()));
}
