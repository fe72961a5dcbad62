package com.example;

public class SettingsFragment extends Fragment {

    public View onCreateView(LayoutInflater inflater, ViewGroup container, Bundle state) {
        refreshSummary();
        return null;
    }

    void refreshSummary() {
        int entries = 4;
        entries = entries - 1;
    }
}
