aw.takeoff()
for step in range(4):
    current_position = aw.get_drone_position()
    aw.fly_to([current_position[0] + 3, current_position[1], current_position[2]])
    current_position = aw.get_drone_position()
    aw.fly_to([current_position[0], current_position[1], current_position[2] - 2])
for step in range(4):
    current_position = aw.get_drone_position()
    aw.fly_to([current_position[0] - 3, current_position[1], current_position[2]])
    current_position = aw.get_drone_position()
    aw.fly_to([current_position[0], current_position[1], current_position[2] + 2])
aw.land()
