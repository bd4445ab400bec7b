fn main() {
    eprintln!("hsgeo: not yet wired up");
    std::process::exit(64);
}
