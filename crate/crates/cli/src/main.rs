fn main() {
    eprintln!("hcomp: not yet wired");
    std::process::exit(2);
}
