public class Gamma {

    String render(String input) {
        return input;
    }

    void drive() {
        render("sample");
    }
}
