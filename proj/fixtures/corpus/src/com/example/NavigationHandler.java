package com.example;

public class NavigationHandler implements NavigationView.OnNavigationItemSelectedListener {

    public boolean onNavigationItemSelected(MenuItem item) {
        return true;
    }
}
