fn main() {
    eprintln!("modsurf: not yet wired");
    std::process::exit(2);
}
