public class Beta {

    void helperOne() {
        int y = 1;
    }

    void helperTwo() {
        helperOne();
    }

    void helperThree() {
        helperTwo();
    }
}
