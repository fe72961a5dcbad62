public class Broken {
    void dangling( {
}
