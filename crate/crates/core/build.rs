fn main() {
    // The SVD oracle calls LAPACK's divide-and-conquer driver from the
    // system OpenBLAS (which bundles LAPACK on Debian/Ubuntu).
    println!("cargo:rustc-link-lib=dylib=openblas");
}
