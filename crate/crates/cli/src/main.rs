fn main() {
    std::process::exit(fracperiod::run(std::env::args_os()));
}
