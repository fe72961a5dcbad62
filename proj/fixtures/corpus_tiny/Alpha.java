public class Alpha {

    void first() {
        second();
    }

    void second() {
        int x = 0;
        x = x + 1;
    }
}
