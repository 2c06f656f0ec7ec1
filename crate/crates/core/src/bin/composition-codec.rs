fn main() {
    let args: Vec<String> = std::env::args().collect();
    std::process::exit(composition_codec::cli::run(&args));
}
