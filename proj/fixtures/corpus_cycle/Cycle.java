public class Cycle extends Activity {

    protected void onCreate(Bundle state) {
        stepA(3);
    }

    void stepA(int n) {
        stepB(n);
    }

    void stepB(int n) {
        stepA(n);
    }
}
