package com.example;

public class ScheduleDialogFragment extends DialogFragment {

    public Dialog onCreateDialog(Bundle savedInstanceState) {
        return null;
    }
}
