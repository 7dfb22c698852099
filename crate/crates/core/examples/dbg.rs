use g2gpa::scalar::cyclotomic::Cyclotomic;
fn main() {
    let z = Cyclotomic::root(48, 1);
    let z8 = z.pow(8).unwrap();
    let z16 = z.pow(16).unwrap();
    let z24 = z.pow(24).unwrap();
    println!("z8  = {:?}", z8);
    println!("z16 = {:?}", z16);
    println!("z24 = {:?}", z24);
    println!("z24 ball = {:?}", z24.to_ball(96).to_f64_pair());
    println!("z ball = {:?}", z.to_ball(96).to_f64_pair());
}
