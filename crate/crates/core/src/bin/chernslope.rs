fn main() {
    std::process::exit(chernslope::cli::run(std::env::args().collect()));
}
