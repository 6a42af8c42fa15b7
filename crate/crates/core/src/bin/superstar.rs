fn main() {
    std::process::exit(peer_bidding::cli::run(std::env::args_os()));
}
