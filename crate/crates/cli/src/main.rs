fn main() {
    std::process::exit(zol::app::run(std::env::args_os()));
}
