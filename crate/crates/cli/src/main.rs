fn main() {
    println!("medial");
}
