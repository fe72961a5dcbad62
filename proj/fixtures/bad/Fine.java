public class Fine {
    void ok() {
        int a = 1;
    }
}
